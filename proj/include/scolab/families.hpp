// families.hpp
#pragma once

#include "scolab/families/coin.hpp"
#include "scolab/families/common.hpp"
#include "scolab/families/gadget.hpp"
#include "scolab/families/logistic.hpp"
#include "scolab/families/quad.hpp"
#include "scolab/families/tent.hpp"
