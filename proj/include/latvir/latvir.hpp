#pragma once

#include "contour.hpp"
#include "correlator.hpp"
#include "kernel.hpp"
#include "lattice.hpp"
#include "modes.hpp"
#include "monomials.hpp"
#include "oracle.hpp"
#include "scalar.hpp"
#include "verify.hpp"
