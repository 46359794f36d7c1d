#pragma once

#include "blocks.hpp"
#include "metrics.hpp"
#include "multipliers.hpp"
#include "netlist.hpp"
#include "netlist_io.hpp"
#include "report.hpp"
#include "sim.hpp"
#include "vectors.hpp"
#include "verilog.hpp"
#include "wide.hpp"
