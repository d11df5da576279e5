# utils module
