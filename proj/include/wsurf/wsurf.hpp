#pragma once

#include "dual.hpp"
#include "errors.hpp"
#include "expr.hpp"
#include "field.hpp"
#include "geometry.hpp"
#include "immersion.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "sigma.hpp"
#include "solutions.hpp"
#include "verify.hpp"
#include "weierstrass.hpp"
#include "wjet.hpp"
