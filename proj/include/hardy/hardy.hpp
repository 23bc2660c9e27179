#pragma once

// Umbrella header for the library.

#include "hardy/common.hpp"
#include "hardy/quadrature.hpp"
#include "hardy/atom.hpp"
#include "hardy/piecewise.hpp"
#include "hardy/parse.hpp"
#include "hardy/integrate.hpp"
#include "hardy/rearrange.hpp"
#include "hardy/hardy_operator.hpp"
#include "hardy/phi.hpp"
#include "hardy/spaces.hpp"
#include "hardy/lorentz.hpp"
#include "hardy/vectmeasure.hpp"
#include "hardy/construct.hpp"
#include "hardy/random.hpp"
