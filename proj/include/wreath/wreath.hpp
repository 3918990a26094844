#pragma once

#include "wreath/errors.hpp"
#include "wreath/numeric.hpp"
#include "wreath/perm.hpp"
#include "wreath/union_find.hpp"
#include "wreath/type_graph.hpp"
#include "wreath/group_search.hpp"
#include "wreath/parallel.hpp"
#include "wreath/cosets.hpp"
#include "wreath/hecke.hpp"
#include "wreath/evolution.hpp"
#include "wreath/polyfit.hpp"
#include "wreath/universal.hpp"
