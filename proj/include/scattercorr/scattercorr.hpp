#pragma once

#include "scattercorr/elastic.hpp"
#include "scattercorr/greenfn.hpp"
#include "scattercorr/scalarwave.hpp"
#include "scattercorr/specfun.hpp"
#include "scattercorr/sphquad.hpp"
#include "scattercorr/types.hpp"
#include "scattercorr/verify.hpp"
