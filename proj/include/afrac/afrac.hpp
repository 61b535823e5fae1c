#pragma once

#include "codespace.hpp"
#include "config.hpp"
#include "dynamics.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "ifs.hpp"
#include "render.hpp"
#include "scheme.hpp"
#include "scheme_io.hpp"
#include "separation.hpp"
#include "verifier.hpp"
