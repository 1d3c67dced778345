// otto_kiln.hpp: umbrella header

#pragma once

#include "otto_kiln/analysis.hpp"
#include "otto_kiln/bath.hpp"
#include "otto_kiln/config.hpp"
#include "otto_kiln/cycle.hpp"
#include "otto_kiln/fock.hpp"
#include "otto_kiln/io.hpp"
#include "otto_kiln/oracle.hpp"
#include "otto_kiln/verify.hpp"
