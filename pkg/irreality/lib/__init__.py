# irreality/lib module
