#pragma once

#include "bayesl/ast.hpp"
#include "bayesl/errors.hpp"
#include "bayesl/evaluator.hpp"
#include "bayesl/factor.hpp"
#include "bayesl/inference.hpp"
#include "bayesl/model_format.hpp"
#include "bayesl/network.hpp"
#include "bayesl/structure.hpp"
#include "bayesl/syntax.hpp"
