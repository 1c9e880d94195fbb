# rgtest: hub-robust graph-based two-sample tests
