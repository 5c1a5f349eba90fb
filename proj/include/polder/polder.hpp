#pragma once

#include "polder/atom.hpp"
#include "polder/audit.hpp"
#include "polder/constants.hpp"
#include "polder/csv.hpp"
#include "polder/dataset.hpp"
#include "polder/errors.hpp"
#include "polder/fitting.hpp"
#include "polder/kramers_kronig.hpp"
#include "polder/levmar.hpp"
#include "polder/lifshitz.hpp"
#include "polder/model_io.hpp"
#include "polder/oscillator.hpp"
#include "polder/quadrature.hpp"
#include "polder/regimes.hpp"
#include "polder/report_io.hpp"
#include "polder/temperature.hpp"
#include "polder/validation.hpp"
