#pragma once

#include "srzoo/zoo/registry.hpp"
