#pragma once

#include "emvkit/arith.hpp"
#include "emvkit/element.hpp"
#include "emvkit/syntax.hpp"
#include "emvkit/algebra.hpp"
#include "emvkit/sqrt.hpp"
#include "emvkit/represent.hpp"
#include "emvkit/laws.hpp"
#include "emvkit/mutation.hpp"
