#pragma once

#include "clgbn/error.hpp"
#include "clgbn/variable.hpp"
#include "clgbn/dag.hpp"
#include "clgbn/distribution.hpp"
#include "clgbn/network.hpp"
#include "clgbn/exact_sum.hpp"
#include "clgbn/compound_vector.hpp"
#include "clgbn/sufficient_statistics.hpp"
#include "clgbn/model_io.hpp"
#include "clgbn/data_stream.hpp"
#include "clgbn/mle.hpp"
#include "clgbn/random.hpp"
#include "clgbn/parallel.hpp"
#include "clgbn/sampling.hpp"
#include "clgbn/query.hpp"
#include "clgbn/greedy.hpp"
#include "clgbn/fss.hpp"
#include "clgbn/synthetic.hpp"
#include "clgbn/bench.hpp"
