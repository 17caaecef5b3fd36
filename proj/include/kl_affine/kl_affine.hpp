#pragma once

#include "kl_affine/errors.hpp"
#include "kl_affine/scalar.hpp"
#include "kl_affine/cartan.hpp"
#include "kl_affine/weight.hpp"
#include "kl_affine/linalg.hpp"
#include "kl_affine/roots.hpp"
#include "kl_affine/integral_system.hpp"
#include "kl_affine/coxeter.hpp"
#include "kl_affine/kl.hpp"
#include "kl_affine/character.hpp"
#include "kl_affine/shapovalov.hpp"
#include "kl_affine/json_io.hpp"
