#pragma once

#include "ddx2/algebra.hpp"
#include "ddx2/bounds.hpp"
#include "ddx2/catalog.hpp"
#include "ddx2/connection.hpp"
#include "ddx2/coverage.hpp"
#include "ddx2/error.hpp"
#include "ddx2/extremal.hpp"
#include "ddx2/family_search.hpp"
#include "ddx2/manifest.hpp"
#include "ddx2/parallel.hpp"
#include "ddx2/rational.hpp"
