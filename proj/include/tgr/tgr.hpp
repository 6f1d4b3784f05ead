#pragma once

#include "tgr/coding.hpp"
#include "tgr/ctgr_system.hpp"
#include "tgr/dump.hpp"
#include "tgr/error.hpp"
#include "tgr/filter.hpp"
#include "tgr/grammar.hpp"
#include "tgr/re_compiler.hpp"
#include "tgr/regular_compiler.hpp"
#include "tgr/tgr_system.hpp"
#include "tgr/word.hpp"
