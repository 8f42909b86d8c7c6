#pragma once

#include "admit.hpp"
#include "bounds.hpp"
#include "digraph.hpp"
#include "errors.hpp"
#include "generators.hpp"
#include "hypergraph.hpp"
#include "io.hpp"
#include "palette.hpp"
#include "parallel.hpp"
#include "random.hpp"
#include "rational.hpp"
#include "search.hpp"
