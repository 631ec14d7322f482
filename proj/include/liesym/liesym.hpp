#pragma once

// Umbrella header: exact symbolic engine for Lie point symmetries of
// semilinear PDEs - jet prolongation, determining systems, structure
// certification, generator verification, and the built-in catalog.

#include "liesym/context.hpp"
#include "liesym/corpus.hpp"
#include "liesym/detsys.hpp"
#include "liesym/expr.hpp"
#include "liesym/jet.hpp"
#include "liesym/multi_index.hpp"
#include "liesym/parser.hpp"
#include "liesym/theorem.hpp"
#include "liesym/verify.hpp"
