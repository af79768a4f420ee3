#pragma once

#include "weakpar/andor.hpp"
#include "weakpar/boolfn.hpp"
#include "weakpar/config.hpp"
#include "weakpar/dtree.hpp"
#include "weakpar/hypercube.hpp"
#include "weakpar/parallel.hpp"
#include "weakpar/qsim.hpp"
#include "weakpar/random.hpp"
#include "weakpar/rational.hpp"
#include "weakpar/weakparity.hpp"
