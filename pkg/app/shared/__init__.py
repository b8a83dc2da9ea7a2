# Archivo para hacer que shared sea un paquete Python
