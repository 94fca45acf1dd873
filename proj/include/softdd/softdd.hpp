#ifndef SOFTDD_SOFTDD_HPP
#define SOFTDD_SOFTDD_HPP

#include "softdd/algebra.hpp"
#include "softdd/config.hpp"
#include "softdd/crosscheck.hpp"
#include "softdd/designer.hpp"
#include "softdd/errors.hpp"
#include "softdd/experiment.hpp"
#include "softdd/metrics.hpp"
#include "softdd/order.hpp"
#include "softdd/propagate.hpp"
#include "softdd/sequences.hpp"
#include "softdd/shapes.hpp"
#include "softdd/table.hpp"

#endif
