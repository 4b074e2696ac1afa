#pragma once

#include "wlayout/constraints.hpp"
#include "wlayout/error.hpp"
#include "wlayout/grid.hpp"
#include "wlayout/io.hpp"
#include "wlayout/refine.hpp"
#include "wlayout/scoring.hpp"
#include "wlayout/search.hpp"
