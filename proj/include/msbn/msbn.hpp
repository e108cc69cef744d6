// SPDX-License-Identifier: Apache-2.0
//
// Umbrella header.

#pragma once

#include "msbn/cli.hpp"
#include "msbn/compile.hpp"
#include "msbn/core.hpp"
#include "msbn/engine.hpp"
#include "msbn/factor.hpp"
#include "msbn/format.hpp"
#include "msbn/graph.hpp"
#include "msbn/hypertree.hpp"
#include "msbn/model.hpp"
#include "msbn/oracle.hpp"
#include "msbn/propagation.hpp"
#include "msbn/random.hpp"
#include "msbn/report.hpp"
