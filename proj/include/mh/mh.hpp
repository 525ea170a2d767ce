#pragma once

#include "mh/bench.hpp"
#include "mh/field.hpp"
#include "mh/io.hpp"
#include "mh/layout.hpp"
#include "mh/matrix.hpp"
#include "mh/multiply.hpp"
#include "mh/submatrix.hpp"
