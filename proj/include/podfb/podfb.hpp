#pragma once

#include "podfb/agent_set.hpp"
#include "podfb/assignment.hpp"
#include "podfb/batch.hpp"
#include "podfb/coalitional.hpp"
#include "podfb/dynamics.hpp"
#include "podfb/feedback.hpp"
#include "podfb/generator.hpp"
#include "podfb/hungarian.hpp"
#include "podfb/instance_json.hpp"
#include "podfb/io.hpp"
#include "podfb/lp.hpp"
#include "podfb/model.hpp"
#include "podfb/money.hpp"
#include "podfb/rational.hpp"
#include "podfb/rng.hpp"
#include "podfb/solver.hpp"
#include "podfb/verify.hpp"
