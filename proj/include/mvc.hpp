#pragma once

#include "mvc/cage_mesh.hpp"
#include "mvc/deformation.hpp"
#include "mvc/derivatives.hpp"
#include "mvc/io.hpp"
#include "mvc/kernels.hpp"
#include "mvc/oracles.hpp"
#include "mvc/parallel.hpp"
#include "mvc/planar.hpp"
#include "mvc/shapes.hpp"
#include "mvc/solver.hpp"
#include "mvc/types.hpp"
#include "mvc/validation.hpp"
#include "mvc/weights.hpp"
