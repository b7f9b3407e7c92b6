#pragma once

#include "hyperqf/gf2.hpp"
#include "hyperqf/intlinalg.hpp"
#include "hyperqf/verdict.hpp"
#include "hyperqf/multiring.hpp"
#include "hyperqf/special_group.hpp"
#include "hyperqf/igr.hpp"
#include "hyperqf/ktheory.hpp"
#include "hyperqf/gamma.hpp"
#include "hyperqf/witt.hpp"
#include "hyperqf/structure_file.hpp"
