#pragma once

#include "nilmkit/error.hpp"
#include "nilmkit/experiment.hpp"
#include "nilmkit/knn.hpp"
#include "nilmkit/metrics.hpp"
#include "nilmkit/preprocess.hpp"
#include "nilmkit/redd.hpp"
#include "nilmkit/report.hpp"
#include "nilmkit/split.hpp"
#include "nilmkit/synth.hpp"
