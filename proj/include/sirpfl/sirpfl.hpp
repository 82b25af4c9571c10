#pragma once

// Umbrella header: the whole toolkit.

#include "sirpfl/generator.hpp"
#include "sirpfl/harness.hpp"
#include "sirpfl/instance.hpp"
#include "sirpfl/io.hpp"
#include "sirpfl/lp_model.hpp"
#include "sirpfl/oracle.hpp"
#include "sirpfl/rational.hpp"
#include "sirpfl/rounding.hpp"
#include "sirpfl/schedule.hpp"
#include "sirpfl/simplex.hpp"
