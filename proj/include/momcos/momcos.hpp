#ifndef MOMCOS_MOMCOS_HPP
#define MOMCOS_MOMCOS_HPP

#include <momcos/numerics.hpp>
#include <momcos/moments.hpp>
#include <momcos/support.hpp>
#include <momcos/quadrature.hpp>
#include <momcos/series.hpp>
#include <momcos/exact_dists.hpp>
#include <momcos/montecarlo.hpp>
#include <momcos/tables.hpp>
#include <momcos/reproduce.hpp>

#endif  // MOMCOS_MOMCOS_HPP
