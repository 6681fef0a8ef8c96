#pragma once

#include "lfmkit/calibration.hpp"
#include "lfmkit/csv.hpp"
#include "lfmkit/divergence.hpp"
#include "lfmkit/error.hpp"
#include "lfmkit/format.hpp"
#include "lfmkit/models.hpp"
#include "lfmkit/projection.hpp"
#include "lfmkit/regression.hpp"
#include "lfmkit/registry.hpp"
#include "lfmkit/scenario.hpp"
#include "lfmkit/series.hpp"
#include "lfmkit/table.hpp"
#include "lfmkit/validate.hpp"
