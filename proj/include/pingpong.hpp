#pragma once

#include "pingpong/field.hpp"
#include "pingpong/padic.hpp"
#include "pingpong/scalar.hpp"
#include "pingpong/matrix.hpp"
#include "pingpong/projective.hpp"
#include "pingpong/random.hpp"
#include "pingpong/cartan.hpp"
#include "pingpong/contraction.hpp"
#include "pingpong/separation.hpp"
#include "pingpong/pingpong.hpp"
#include "pingpong/lie.hpp"
