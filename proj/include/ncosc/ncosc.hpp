#pragma once

#include "config.hpp"
#include "energy.hpp"
#include "ermakov.hpp"
#include "errors.hpp"
#include "hamiltonian.hpp"
#include "invariant.hpp"
#include "specfun.hpp"
#include "spectrum.hpp"
