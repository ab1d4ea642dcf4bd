#pragma once

#include "bqror/chain.hpp"
#include "bqror/diagnostics.hpp"
#include "bqror/distributions.hpp"
#include "bqror/errors.hpp"
#include "bqror/model.hpp"
#include "bqror/or1.hpp"
#include "bqror/or2.hpp"
#include "bqror/rng.hpp"
#include "bqror/simdata.hpp"
