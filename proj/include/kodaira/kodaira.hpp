#pragma once

#include "kodaira/rational.hpp"
#include "kodaira/lattice.hpp"
#include "kodaira/polynomial.hpp"
#include "kodaira/linear_feasibility.hpp"
#include "kodaira/kodaira_db.hpp"
#include "kodaira/zariski.hpp"
#include "kodaira/blowup.hpp"
#include "kodaira/invariants.hpp"
#include "kodaira/y_restriction.hpp"
#include "kodaira/report.hpp"
#include "kodaira/verify.hpp"
#include "kodaira/json_io.hpp"
