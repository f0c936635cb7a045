#pragma once

#include "hermfactor/certify.hpp"
#include "hermfactor/expression.hpp"
#include "hermfactor/factor.hpp"
#include "hermfactor/form.hpp"
#include "hermfactor/json_io.hpp"
#include "hermfactor/matrix.hpp"
#include "hermfactor/multiindex.hpp"
#include "hermfactor/operator_link.hpp"
#include "hermfactor/rational.hpp"
#include "hermfactor/sphere.hpp"
#include "hermfactor/stabilize.hpp"
#include "hermfactor/symbols.hpp"
