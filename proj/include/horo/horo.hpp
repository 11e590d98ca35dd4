#pragma once

#include "horo/types.hpp"
#include "horo/poly.hpp"
#include "horo/roots.hpp"
#include "horo/rational_map.hpp"
#include "horo/centered.hpp"
#include "horo/periodic.hpp"
#include "horo/orbits.hpp"
#include "horo/cocycle.hpp"
#include "horo/julia.hpp"
#include "horo/quadratic.hpp"
#include "horo/io.hpp"
#include "horo/svg.hpp"
#include "horo/suite.hpp"
