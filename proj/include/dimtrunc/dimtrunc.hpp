#pragma once

#include "dimtrunc/error.hpp"
#include "dimtrunc/error_table.hpp"
#include "dimtrunc/experiment.hpp"
#include "dimtrunc/fem.hpp"
#include "dimtrunc/lattice.hpp"
#include "dimtrunc/oracle.hpp"
#include "dimtrunc/parallel.hpp"
#include "dimtrunc/quadrature.hpp"
#include "dimtrunc/random_field.hpp"
#include "dimtrunc/svg_plot.hpp"
#include "dimtrunc/theory.hpp"
