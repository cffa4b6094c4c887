#pragma once

#include "openness/bargaining.hpp"
#include "openness/best_response.hpp"
#include "openness/core_model.hpp"
#include "openness/errors.hpp"
#include "openness/oracle.hpp"
#include "openness/regulation.hpp"
#include "openness/serialization.hpp"
