#pragma once

// Convenience umbrella: the whole library in one include.

#include "illusolve/cli.hpp"
#include "illusolve/errors.hpp"
#include "illusolve/exact.hpp"
#include "illusolve/generators.hpp"
#include "illusolve/graph.hpp"
#include "illusolve/instance.hpp"
#include "illusolve/io.hpp"
#include "illusolve/parallel.hpp"
#include "illusolve/ptas.hpp"
#include "illusolve/reductions.hpp"
#include "illusolve/tree_decomposition.hpp"
#include "illusolve/treewidth_dp.hpp"
#include "illusolve/vc_solver.hpp"
