#pragma once

#include "casimir/circuit.hpp"
#include "casimir/dispersion.hpp"
#include "casimir/engine.hpp"
#include "casimir/green_em.hpp"
#include "casimir/hyperdim.hpp"
#include "casimir/matsubara.hpp"
#include "casimir/specfun.hpp"
#include "casimir/types.hpp"
