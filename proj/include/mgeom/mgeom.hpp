#pragma once
#ifndef MGEOM_MGEOM_HPP
#define MGEOM_MGEOM_HPP

#include <mgeom/errors.hpp>
#include <mgeom/numeric.hpp>

#include <mgeom/metric/covering.hpp>
#include <mgeom/metric/isometry.hpp>
#include <mgeom/metric/operations.hpp>
#include <mgeom/metric/space.hpp>
#include <mgeom/metric/validate.hpp>

#include <mgeom/cantor/blocks.hpp>
#include <mgeom/cantor/cantor.hpp>
#include <mgeom/cantor/dimensional_type.hpp>
#include <mgeom/cantor/factory.hpp>
#include <mgeom/cantor/sequences.hpp>

#include <mgeom/gromov/gromov.hpp>

#include <mgeom/telescope/simplex_path.hpp>
#include <mgeom/telescope/telescope.hpp>

#include <mgeom/random.hpp>

#endif  // MGEOM_MGEOM_HPP
