#pragma once

#include "organics/batch.hpp"
#include "organics/biophysical.hpp"
#include "organics/config.hpp"
#include "organics/core.hpp"
#include "organics/dynamics.hpp"
#include "organics/eigen.hpp"
#include "organics/io.hpp"
#include "organics/prediction.hpp"
#include "organics/scenarios.hpp"
#include "organics/signal.hpp"
#include "organics/spectral.hpp"
#include "organics/weights.hpp"
