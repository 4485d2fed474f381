#pragma once

#include "enscribe/common.hpp"
#include "enscribe/text.hpp"
#include "enscribe/equivalence.hpp"
#include "enscribe/params.hpp"
#include "enscribe/ranges.hpp"
#include "enscribe/search.hpp"
#include "enscribe/solvers.hpp"
#include "enscribe/screen.hpp"
#include "enscribe/procedure.hpp"
#include "enscribe/cloning.hpp"
#include "enscribe/random.hpp"
#include "enscribe/io.hpp"
