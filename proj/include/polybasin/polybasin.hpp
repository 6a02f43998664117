#pragma once

#include "polybasin/error.hpp"
#include "polybasin/rng.hpp"
#include "polybasin/params.hpp"
#include "polybasin/generator.hpp"
#include "polybasin/eval.hpp"
#include "polybasin/classio.hpp"
#include "polybasin/harness.hpp"
