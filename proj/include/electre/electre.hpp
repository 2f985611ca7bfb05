#pragma once

#include "core_model.hpp"
#include "engine.hpp"
#include "io.hpp"
#include "ranking.hpp"
#include "sensitivity.hpp"
#include "survey.hpp"
