#pragma once

#include "errors.hpp"
#include "scalars.hpp"
#include "presentation.hpp"
#include "groebner.hpp"
#include "algebra.hpp"
#include "modules.hpp"
#include "resolution.hpp"
#include "delta.hpp"
#include "ext.hpp"
#include "io.hpp"
#include "cli.hpp"
