#pragma once

#include "windings/verify.hpp"

#include <vector>

namespace windings::detail {

std::vector<ExperimentInfo> build_registry();

}  // namespace windings::detail
