#pragma once

#include "jspec/algebra.hpp"
#include "jspec/errors.hpp"
#include "jspec/jacobi.hpp"
#include "jspec/orbits.hpp"
#include "jspec/path.hpp"
#include "jspec/permsets.hpp"
#include "jspec/random.hpp"
#include "jspec/spectral.hpp"
#include "jspec/spectralsets.hpp"
