#ifndef UNIDYM_HPP
#define UNIDYM_HPP

#include "unidym/errors.hpp"
#include "unidym/interval.hpp"
#include "unidym/jet.hpp"
#include "unidym/polynomial.hpp"
#include "unidym/map_model.hpp"
#include "unidym/map_analysis.hpp"
#include "unidym/crossratio.hpp"
#include "unidym/schwarzian.hpp"
#include "unidym/chains.hpp"
#include "unidym/critical_intervals.hpp"
#include "unidym/cutting.hpp"
#include "unidym/orbits.hpp"
#include "unidym/rng.hpp"
#include "unidym/records.hpp"
#include "unidym/config.hpp"
#include "unidym/emit.hpp"
#include "unidym/plot.hpp"
#include "unidym/experiments.hpp"

#endif  // UNIDYM_HPP
