#pragma once
// Everything at once.

#include "acceptance.hpp"
#include "config.hpp"
#include "free_energy.hpp"
#include "lattice.hpp"
#include "neumann.hpp"
#include "numeric.hpp"
#include "potentials.hpp"
#include "regimes.hpp"
#include "regularize.hpp"
#include "scattering.hpp"
#include "verdict.hpp"
