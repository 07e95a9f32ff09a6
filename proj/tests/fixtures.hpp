#pragma once

#include "mcc/instances.hpp"

namespace mcc::testing {

using mcc::deterministic_graph;
using mcc::Instance;
using mcc::non_submodular_example;
using mcc::three_cascade_example;

}  // namespace mcc::testing
