#ifndef GASWALL_GASWALL_HPP
#define GASWALL_GASWALL_HPP

#include <gaswall/error.hpp>
#include <gaswall/log_gas.hpp>
#include <gaswall/mc.hpp>
#include <gaswall/numerics.hpp>
#include <gaswall/parallel.hpp>
#include <gaswall/potential.hpp>
#include <gaswall/special_fns.hpp>
#include <gaswall/transition.hpp>
#include <gaswall/yukawa_gas.hpp>

#endif // GASWALL_GASWALL_HPP
