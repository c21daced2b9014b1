#pragma once

#include "hdi/error.hpp"
#include "hdi/numeric.hpp"
#include "hdi/rng.hpp"
#include "hdi/types.hpp"
#include "hdi/divergence.hpp"
#include "hdi/between_group.hpp"
#include "hdi/scenario.hpp"
#include "hdi/survey.hpp"
#include "hdi/linearization.hpp"
#include "hdi/replication.hpp"
