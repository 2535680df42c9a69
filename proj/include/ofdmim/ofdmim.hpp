#pragma once

#include "ofdmim/analysis.hpp"
#include "ofdmim/channel.hpp"
#include "ofdmim/core.hpp"
#include "ofdmim/detect.hpp"
#include "ofdmim/dither.hpp"
#include "ofdmim/error.hpp"
#include "ofdmim/fft.hpp"
#include "ofdmim/harness.hpp"
#include "ofdmim/modem.hpp"
#include "ofdmim/rng.hpp"
