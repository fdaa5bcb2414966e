#pragma once

#include "qsl/errors.hpp"
#include "qsl/matcore.hpp"
#include "qsl/metrics.hpp"
#include "qsl/quadrature.hpp"
#include "qsl/models.hpp"
#include "qsl/engine.hpp"
#include "qsl/sweep.hpp"
