# Stein-Local - Bornes d'approximation normale sous dependance locale
