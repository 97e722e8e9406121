#pragma once

#include "blipfield/casimir.hpp"
#include "blipfield/core.hpp"
#include "blipfield/dynamics.hpp"
#include "blipfield/error.hpp"
#include "blipfield/fermi.hpp"
#include "blipfield/numerics.hpp"
#include "blipfield/parallel.hpp"
#include "blipfield/spectral.hpp"
