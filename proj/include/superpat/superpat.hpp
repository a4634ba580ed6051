#pragma once

#include "bounds.hpp"
#include "caps.hpp"
#include "dfa.hpp"
#include "dfa_io.hpp"
#include "error.hpp"
#include "ext_cost.hpp"
#include "patterns.hpp"
#include "report.hpp"
#include "rng.hpp"
#include "stats.hpp"
#include "walks.hpp"
#include "word.hpp"
