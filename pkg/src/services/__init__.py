# services module
