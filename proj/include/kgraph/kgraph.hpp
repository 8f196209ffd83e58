#pragma once

// Umbrella header: combinatorial higher-rank graphs, their skew products
// over semigroups, and the structural deciders (connectivity,
// primitivity, aperiodicity, cofinality and friends) that settle the
// simplicity of the associated algebras.

#include "kgraph/algebra.hpp"
#include "kgraph/builtins.hpp"
#include "kgraph/deciders.hpp"
#include "kgraph/degree.hpp"
#include "kgraph/dsl.hpp"
#include "kgraph/errors.hpp"
#include "kgraph/graph.hpp"
#include "kgraph/intmat.hpp"
#include "kgraph/lattice.hpp"
#include "kgraph/path.hpp"
#include "kgraph/run.hpp"
#include "kgraph/semigroup.hpp"
#include "kgraph/skew.hpp"
#include "kgraph/verdict.hpp"
