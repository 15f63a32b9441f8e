#pragma once

#define BWAVE_VERSION "0.1.0"
