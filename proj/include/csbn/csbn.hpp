#pragma once

#include "core_model.hpp"
#include "corrected_score.hpp"
#include "dag_tools.hpp"
#include "errors.hpp"
#include "estimators.hpp"
#include "io.hpp"
#include "metrics.hpp"
#include "penalty.hpp"
#include "polynomial.hpp"
#include "simgen.hpp"
#include "tuning.hpp"
