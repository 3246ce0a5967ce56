#pragma once

#include "ckdv/analytic.hpp"
#include "ckdv/config.hpp"
#include "ckdv/convergence.hpp"
#include "ckdv/diagnostics.hpp"
#include "ckdv/error.hpp"
#include "ckdv/integrate.hpp"
#include "ckdv/io.hpp"
#include "ckdv/model.hpp"
#include "ckdv/presets.hpp"
#include "ckdv/runner.hpp"
#include "ckdv/scheme.hpp"
#include "ckdv/stability.hpp"
#include "ckdv/svg.hpp"
