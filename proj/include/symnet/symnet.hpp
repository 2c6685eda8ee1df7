#pragma once

#include "symnet/activation.hpp"
#include "symnet/analysis.hpp"
#include "symnet/analytic.hpp"
#include "symnet/error.hpp"
#include "symnet/group.hpp"
#include "symnet/matrix.hpp"
#include "symnet/network.hpp"
#include "symnet/pattern.hpp"
#include "symnet/permutation.hpp"
#include "symnet/random.hpp"
#include "symnet/spectrum.hpp"
#include "symnet/train.hpp"
#include "symnet/weight_template.hpp"
