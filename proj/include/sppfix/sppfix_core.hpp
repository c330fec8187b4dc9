#pragma once

// Everything except the JSON/CLI surface.

#include "sppfix/bigfloat.hpp"
#include "sppfix/certify.hpp"
#include "sppfix/clean.hpp"
#include "sppfix/decompose.hpp"
#include "sppfix/errors.hpp"
#include "sppfix/frontends.hpp"
#include "sppfix/geometry.hpp"
#include "sppfix/iterate.hpp"
#include "sppfix/linear_solver.hpp"
#include "sppfix/parser.hpp"
#include "sppfix/polynomial.hpp"
#include "sppfix/quadratic.hpp"
#include "sppfix/rational.hpp"
#include "sppfix/scalar.hpp"
#include "sppfix/stats.hpp"
#include "sppfix/system.hpp"
