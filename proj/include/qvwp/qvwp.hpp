#pragma once

#include "types.hpp"
#include "rational.hpp"
#include "qseries.hpp"
#include "params.hpp"
#include "operators.hpp"
#include "eigenfun.hpp"
#include "idcheck.hpp"
#include "report_json.hpp"
