#pragma once

#include <vector>

#include "cgc/profile.hpp"

namespace cgc::verify {

// Representative curvature values for a regime of a space form.
std::vector<double> representative_K(const profile::SpaceForm& space, profile::Regime regime);

// n interior points of a branch's parameter interval; unbounded intervals are
// sampled on [0.1, 3] (or its negative).
std::vector<double> param_grid(const profile::Branch& branch, int n);

// Parameters for row at every representative K and n grid values.
std::vector<profile::CaseParams> case_grid(profile::Row row, int n);

}  // namespace cgc::verify
