#pragma once

#include "orderdual/errors.hpp"
#include "orderdual/element_set.hpp"
#include "orderdual/poset.hpp"
#include "orderdual/lattice.hpp"
#include "orderdual/maps.hpp"
#include "orderdual/duality.hpp"
#include "orderdual/matrix.hpp"
#include "orderdual/markov.hpp"
#include "orderdual/rng.hpp"
#include "orderdual/flow.hpp"
#include "orderdual/percolation.hpp"
#include "orderdual/models.hpp"
#include "orderdual/io.hpp"
