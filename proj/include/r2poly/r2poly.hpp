#ifndef R2POLY_R2POLY_HPP
#define R2POLY_R2POLY_HPP

#include "chains.hpp"
#include "error.hpp"
#include "exact_eval.hpp"
#include "f2.hpp"
#include "graph.hpp"
#include "graph_io.hpp"
#include "mixing.hpp"
#include "parallel.hpp"
#include "random_graphs.hpp"
#include "rational.hpp"
#include "reductions.hpp"
#include "rng.hpp"
#include "selftest.hpp"

#endif // R2POLY_R2POLY_HPP
