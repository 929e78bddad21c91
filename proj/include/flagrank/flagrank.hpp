#pragma once

// Umbrella header: the whole exact flag/Grassmannian rank toolkit.

#include "flagrank/bounds.hpp"
#include "flagrank/cache.hpp"
#include "flagrank/combinatorics.hpp"
#include "flagrank/config.hpp"
#include "flagrank/embedding.hpp"
#include "flagrank/errors.hpp"
#include "flagrank/linalg.hpp"
#include "flagrank/oscproj.hpp"
#include "flagrank/report.hpp"
#include "flagrank/rng.hpp"
#include "flagrank/scalars.hpp"
#include "flagrank/secant.hpp"
#include "flagrank/shape.hpp"
#include "flagrank/spans.hpp"
#include "flagrank/verify.hpp"
