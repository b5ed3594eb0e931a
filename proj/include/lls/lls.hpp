#pragma once

#include "lls/accumulator.hpp"
#include "lls/cmv.hpp"
#include "lls/deterministic.hpp"
#include "lls/ensembles.hpp"
#include "lls/error.hpp"
#include "lls/experiments.hpp"
#include "lls/fredholm.hpp"
#include "lls/histogram.hpp"
#include "lls/io.hpp"
#include "lls/linalg.hpp"
#include "lls/painleve.hpp"
#include "lls/parallel.hpp"
#include "lls/quadrature.hpp"
#include "lls/random.hpp"
#include "lls/spacing.hpp"
#include "lls/spectrum.hpp"
#include "lls/statistics.hpp"
#include "lls/syk.hpp"
#include "lls/theory.hpp"
