#pragma once

#include "evswap/core.hpp"
#include "evswap/normal.hpp"
#include "evswap/geometry.hpp"
#include "evswap/inventory.hpp"
#include "evswap/regulation.hpp"
#include "evswap/market_io.hpp"
#include "evswap/econ.hpp"
#include "evswap/optimizer.hpp"
#include "evswap/scenarios.hpp"
#include "evswap/simkit.hpp"
#include "evswap/config.hpp"
#include "evswap/report.hpp"
#include "evswap/cli.hpp"
