#pragma once

/**
 * @file adequal.hpp
 * @brief Umbrella header for the adequality engine.
 *
 * An exact-arithmetic model of an infinitesimal-enriched ordered field
 * (truncated Laurent series in E over exact rationals or tolerance-aware
 * doubles), the relations "infinitely close" and "adequal" with a standard
 * part map, incremental solvers for extrema, subtangents, parametric
 * tangents and refraction, and a checker for the derivation traces they
 * emit.
 */

#include "adequal/checker.hpp"
#include "adequal/coefficient.hpp"
#include "adequal/derivation.hpp"
#include "adequal/errors.hpp"
#include "adequal/eval.hpp"
#include "adequal/expr.hpp"
#include "adequal/multipoly.hpp"
#include "adequal/polynomial.hpp"
#include "adequal/rational.hpp"
#include "adequal/rational_function.hpp"
#include "adequal/series.hpp"
#include "adequal/solvers.hpp"
