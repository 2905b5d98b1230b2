#pragma once

#include "qumi/errors.hpp"
#include "qumi/linalg.hpp"
#include "qumi/measurement.hpp"
#include "qumi/measures.hpp"
#include "qumi/optimizer.hpp"
#include "qumi/states.hpp"
