#pragma once

#include "repulse/data_io.hpp"
#include "repulse/dataset.hpp"
#include "repulse/error.hpp"
#include "repulse/mingling.hpp"
#include "repulse/mlp.hpp"
#include "repulse/parallel.hpp"
#include "repulse/rng.hpp"
#include "repulse/sampling.hpp"
#include "repulse/statistics.hpp"
#include "repulse/trainer.hpp"
