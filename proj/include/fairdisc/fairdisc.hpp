#pragma once

#include "fairdisc/binomial.hpp"
#include "fairdisc/chains.hpp"
#include "fairdisc/discrepancy.hpp"
#include "fairdisc/errors.hpp"
#include "fairdisc/events.hpp"
#include "fairdisc/fairness.hpp"
#include "fairdisc/generators.hpp"
#include "fairdisc/json_io.hpp"
#include "fairdisc/quadratic.hpp"
#include "fairdisc/rational.hpp"
#include "fairdisc/rng.hpp"
#include "fairdisc/types.hpp"
