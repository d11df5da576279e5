# models module
