#pragma once

#include "apdg/mesh_basis.hpp"

namespace apdg {

/// Micro-macro unknowns f = rho + eps g, with g stored at v = +1 and v = -1.
struct KineticState {
  DGField rho;
  DGField g_plus;
  DGField g_minus;
  double epsilon;
};

}  // namespace apdg
