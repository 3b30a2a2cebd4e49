#pragma once

#include "vbsmpe/core.hpp"
#include "vbsmpe/dst.hpp"
#include "vbsmpe/error.hpp"
#include "vbsmpe/ga.hpp"
#include "vbsmpe/generate.hpp"
#include "vbsmpe/io.hpp"
#include "vbsmpe/model.hpp"
#include "vbsmpe/oracle.hpp"
#include "vbsmpe/prob.hpp"
