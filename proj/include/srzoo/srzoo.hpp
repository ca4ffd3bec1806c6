#pragma once

#include "srzoo/analysis.hpp"
#include "srzoo/conv.hpp"
#include "srzoo/data.hpp"
#include "srzoo/error.hpp"
#include "srzoo/executor.hpp"
#include "srzoo/graph.hpp"
#include "srzoo/graph_io.hpp"
#include "srzoo/loss.hpp"
#include "srzoo/metrics.hpp"
#include "srzoo/ops.hpp"
#include "srzoo/parallel.hpp"
#include "srzoo/prune.hpp"
#include "srzoo/report.hpp"
#include "srzoo/resize.hpp"
#include "srzoo/search.hpp"
#include "srzoo/tensor.hpp"
#include "srzoo/timing.hpp"
#include "srzoo/tracks.hpp"
#include "srzoo/weights.hpp"
#include "srzoo/zoo.hpp"
