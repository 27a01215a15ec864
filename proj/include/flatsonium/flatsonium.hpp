#pragma once

#include "flatsonium/circuit.hpp"
#include "flatsonium/commands.hpp"
#include "flatsonium/config.hpp"
#include "flatsonium/error.hpp"
#include "flatsonium/noise.hpp"
#include "flatsonium/oracle.hpp"
#include "flatsonium/parallel.hpp"
#include "flatsonium/spectrum.hpp"
#include "flatsonium/verify.hpp"
