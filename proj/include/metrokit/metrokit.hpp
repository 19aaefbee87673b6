#ifndef METROKIT_METROKIT_HPP
#define METROKIT_METROKIT_HPP

#include "metrokit/bounds.hpp"
#include "metrokit/channels.hpp"
#include "metrokit/errors.hpp"
#include "metrokit/experiments.hpp"
#include "metrokit/linalg.hpp"
#include "metrokit/operators.hpp"
#include "metrokit/optim.hpp"
#include "metrokit/qfi.hpp"
#include "metrokit/serialize.hpp"
#include "metrokit/states.hpp"
#include "metrokit/su2.hpp"

#endif
