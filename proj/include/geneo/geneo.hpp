#pragma once

#include "geneo/augment.hpp"
#include "geneo/bottleneck.hpp"
#include "geneo/cluster.hpp"
#include "geneo/core.hpp"
#include "geneo/io.hpp"
#include "geneo/isometry.hpp"
#include "geneo/learn.hpp"
#include "geneo/metrics.hpp"
#include "geneo/operators.hpp"
#include "geneo/parallel.hpp"
#include "geneo/persistence.hpp"
#include "geneo/pipeline.hpp"
#include "geneo/preprocess.hpp"
#include "geneo/rng.hpp"
#include "geneo/serialize.hpp"
