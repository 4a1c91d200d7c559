#!/usr/bin/env python3
"""Generate the bundled API whitelist data files.

Writes src/apichain/data/packages.txt (243 platform + 95 google package
names) and src/apichain/data/classes.txt (4855 platform + 1116 google
class names). A curated core of real Android/Google API names is kept
verbatim; the remainder is deterministic filler (clearly marked *.aux.*
packages and Gen#### classes) so the list sizes match the documented
API-level-24 inventory without redistributing the full reference dumps.

Run from the repo root:  python scripts/make_whitelists.py
"""

from pathlib import Path

OUT_DIR = Path(__file__).resolve().parents[1] / "src" / "apichain" / "data"

N_PLATFORM_PACKAGES = 243
N_GOOGLE_PACKAGES = 95
N_PLATFORM_CLASSES = 4855
N_GOOGLE_CLASSES = 1116

# Real framework packages (android.* plus the java/javax/org/junit packages
# the platform documentation ships). org.xmlpull is deliberately left out:
# it carries no family prefix and would break family/package coherence.
PLATFORM_PACKAGES = """
android
android.accessibilityservice
android.accounts
android.animation
android.annotation
android.app
android.app.admin
android.app.assist
android.app.backup
android.app.job
android.app.usage
android.appwidget
android.bluetooth
android.bluetooth.le
android.content
android.content.pm
android.content.res
android.database
android.database.sqlite
android.databinding
android.drm
android.gesture
android.graphics
android.graphics.drawable
android.graphics.drawable.shapes
android.graphics.pdf
android.hardware
android.hardware.camera2
android.hardware.camera2.params
android.hardware.display
android.hardware.fingerprint
android.hardware.input
android.hardware.usb
android.icu.lang
android.icu.math
android.icu.text
android.icu.util
android.inputmethodservice
android.location
android.media
android.media.audiofx
android.media.browse
android.media.effect
android.media.midi
android.media.projection
android.media.session
android.media.tv
android.mtp
android.net
android.net.http
android.net.nsd
android.net.rtp
android.net.sip
android.net.wifi
android.net.wifi.p2p
android.net.wifi.p2p.nsd
android.nfc
android.nfc.cardemulation
android.nfc.tech
android.opengl
android.os
android.os.health
android.os.storage
android.preference
android.print
android.print.pdf
android.printservice
android.provider
android.renderscript
android.sax
android.security
android.security.keystore
android.service.carrier
android.service.chooser
android.service.dreams
android.service.media
android.service.notification
android.service.quicksettings
android.service.textservice
android.service.voice
android.service.wallpaper
android.speech
android.speech.tts
android.system
android.telecom
android.telephony
android.telephony.cdma
android.telephony.gsm
android.test
android.test.mock
android.test.suitebuilder
android.test.suitebuilder.annotation
android.text
android.text.format
android.text.method
android.text.style
android.text.util
android.transition
android.util
android.view
android.view.accessibility
android.view.animation
android.view.inputmethod
android.view.textservice
android.webkit
android.widget
java.awt.font
java.beans
java.io
java.lang
java.lang.annotation
java.lang.invoke
java.lang.ref
java.lang.reflect
java.math
java.net
java.nio
java.nio.channels
java.nio.channels.spi
java.nio.charset
java.nio.charset.spi
java.nio.file
java.nio.file.attribute
java.nio.file.spi
java.security
java.security.acl
java.security.cert
java.security.interfaces
java.security.spec
java.sql
java.text
java.util
java.util.concurrent
java.util.concurrent.atomic
java.util.concurrent.locks
java.util.function
java.util.jar
java.util.logging
java.util.prefs
java.util.regex
java.util.stream
java.util.zip
javax.crypto
javax.crypto.interfaces
javax.crypto.spec
javax.microedition.khronos.egl
javax.microedition.khronos.opengles
javax.net
javax.net.ssl
javax.security.auth
javax.security.auth.callback
javax.security.auth.login
javax.security.auth.x500
javax.security.cert
javax.sql
javax.xml
javax.xml.datatype
javax.xml.namespace
javax.xml.parsers
javax.xml.transform
javax.xml.transform.dom
javax.xml.transform.sax
javax.xml.transform.stream
javax.xml.validation
javax.xml.xpath
junit.framework
junit.runner
org.json
org.w3c.dom
org.w3c.dom.ls
org.xml.sax
org.xml.sax.ext
org.xml.sax.helpers
org.apache.http
org.apache.http.params
""".split()

GOOGLE_PACKAGES = """
com.google.android.gms.actions
com.google.android.gms.ads
com.google.android.gms.ads.doubleclick
com.google.android.gms.ads.identifier
com.google.android.gms.ads.mediation
com.google.android.gms.analytics
com.google.android.gms.analytics.ecommerce
com.google.android.gms.appindexing
com.google.android.gms.appinvite
com.google.android.gms.auth
com.google.android.gms.auth.api
com.google.android.gms.auth.api.credentials
com.google.android.gms.auth.api.signin
com.google.android.gms.awareness
com.google.android.gms.cast
com.google.android.gms.cast.framework
com.google.android.gms.common
com.google.android.gms.common.api
com.google.android.gms.common.images
com.google.android.gms.drive
com.google.android.gms.drive.events
com.google.android.gms.drive.metadata
com.google.android.gms.drive.query
com.google.android.gms.fitness
com.google.android.gms.fitness.data
com.google.android.gms.fitness.request
com.google.android.gms.games
com.google.android.gms.games.achievement
com.google.android.gms.games.event
com.google.android.gms.games.leaderboard
com.google.android.gms.games.multiplayer
com.google.android.gms.gcm
com.google.android.gms.identity.intents
com.google.android.gms.iid
com.google.android.gms.instantapps
com.google.android.gms.location
com.google.android.gms.location.places
com.google.android.gms.maps
com.google.android.gms.maps.model
com.google.android.gms.nearby
com.google.android.gms.nearby.connection
com.google.android.gms.nearby.messages
com.google.android.gms.panorama
com.google.android.gms.plus
com.google.android.gms.safetynet
com.google.android.gms.search
com.google.android.gms.security
com.google.android.gms.tagmanager
com.google.android.gms.tasks
com.google.android.gms.vision
com.google.android.gms.vision.barcode
com.google.android.gms.vision.face
com.google.android.gms.vision.text
com.google.android.gms.wallet
com.google.android.gms.wearable
com.google.firebase
com.google.firebase.analytics
com.google.firebase.app.indexing
com.google.firebase.auth
com.google.firebase.crash
com.google.firebase.database
com.google.firebase.iid
com.google.firebase.messaging
com.google.firebase.provider
com.google.firebase.remoteconfig
com.google.firebase.storage
""".split()

# Real class names kept verbatim; everything the test fixtures touch must
# stay in this block.
CURATED_CLASSES = {
    "android": ["R", "Manifest"],
    "android.accounts": ["Account", "AccountManager", "AccountManagerCallback", "AuthenticatorException"],
    "android.animation": ["Animator", "AnimatorSet", "ObjectAnimator", "ValueAnimator", "TimeInterpolator"],
    "android.app": [
        "Activity", "ActivityManager", "AlarmManager", "AlertDialog", "Application",
        "DownloadManager", "Dialog", "DialogFragment", "Fragment", "FragmentManager",
        "Instrumentation", "IntentService", "KeyguardManager", "ListActivity", "ListFragment",
        "LoaderManager", "Notification", "NotificationManager", "PendingIntent", "ProgressDialog",
        "SearchManager", "Service", "TaskStackBuilder", "UiModeManager", "WallpaperManager",
    ],
    "android.app.admin": ["DevicePolicyManager", "DeviceAdminReceiver"],
    "android.app.job": ["JobInfo", "JobParameters", "JobScheduler", "JobService"],
    "android.bluetooth": ["BluetoothAdapter", "BluetoothDevice", "BluetoothSocket", "BluetoothManager"],
    "android.content": [
        "ActivityNotFoundException", "AsyncQueryHandler", "BroadcastReceiver", "ClipData",
        "ClipboardManager", "ComponentName", "ContentProvider", "ContentResolver", "ContentUris",
        "ContentValues", "Context", "ContextWrapper", "CursorLoader", "Intent", "IntentFilter",
        "Loader", "ServiceConnection", "SharedPreferences",
    ],
    "android.content.pm": ["ApplicationInfo", "PackageInfo", "PackageManager", "ResolveInfo", "Signature"],
    "android.content.res": ["AssetManager", "ColorStateList", "Configuration", "Resources", "TypedArray"],
    "android.database": ["Cursor", "CursorWrapper", "DataSetObserver", "MatrixCursor", "SQLException"],
    "android.database.sqlite": ["SQLiteDatabase", "SQLiteOpenHelper", "SQLiteStatement", "SQLiteException"],
    "android.graphics": ["Bitmap", "BitmapFactory", "Canvas", "Color", "Matrix", "Paint", "Path", "Rect", "RectF", "Typeface"],
    "android.graphics.drawable": ["BitmapDrawable", "ColorDrawable", "Drawable", "GradientDrawable"],
    "android.hardware": ["Camera", "Sensor", "SensorEvent", "SensorEventListener", "SensorManager"],
    "android.hardware.camera2": ["CameraCaptureSession", "CameraCharacteristics", "CameraDevice", "CameraManager"],
    "android.hardware.fingerprint": ["FingerprintManager"],
    "android.location": ["Address", "Criteria", "Geocoder", "Location", "LocationListener", "LocationManager"],
    "android.media": ["AudioManager", "AudioRecord", "AudioTrack", "MediaCodec", "MediaPlayer", "MediaRecorder", "Ringtone", "RingtoneManager", "SoundPool"],
    "android.media.projection": ["MediaProjection", "MediaProjectionManager"],
    "android.net": ["ConnectivityManager", "NetworkInfo", "Uri", "TrafficStats", "VpnService"],
    "android.net.http": ["AndroidHttpClient", "HttpResponseCache", "SslCertificate", "SslError"],
    "android.net.wifi": ["ScanResult", "WifiConfiguration", "WifiInfo", "WifiManager"],
    "android.nfc": ["NfcAdapter", "NfcEvent", "NfcManager", "NdefMessage", "NdefRecord", "Tag"],
    "android.opengl": ["GLES20", "GLSurfaceView", "GLUtils", "Matrix"],
    "android.os": [
        "AsyncTask", "BatteryManager", "Binder", "Build", "Bundle", "CountDownTimer", "DeadObjectException",
        "Debug", "DropBoxManager", "Environment", "FileObserver", "Handler", "HandlerThread", "IBinder",
        "Looper", "Message", "Messenger", "Parcel", "ParcelFileDescriptor", "ParcelUuid", "Parcelable",
        "PowerManager", "Process", "RemoteException", "ResultReceiver", "StatFs", "StrictMode",
        "SystemClock", "Trace", "UserHandle", "UserManager", "Vibrator", "WorkSource",
    ],
    "android.os.health": [
        "HealthStats", "PackageHealthStats", "PidHealthStats", "ProcessHealthStats",
        "ServiceHealthStats", "SystemHealthManager", "TimerStat", "UidHealthStats",
    ],
    "android.os.storage": ["StorageManager", "StorageVolume", "OnObbStateChangeListener"],
    "android.preference": ["CheckBoxPreference", "EditTextPreference", "ListPreference", "Preference", "PreferenceActivity", "PreferenceFragment", "PreferenceManager"],
    "android.provider": ["BaseColumns", "CalendarContract", "CallLog", "ContactsContract", "MediaStore", "Settings", "Telephony"],
    "android.security": ["KeyChain", "KeyChainException", "NetworkSecurityPolicy"],
    "android.security.keystore": ["KeyGenParameterSpec", "KeyInfo", "KeyProperties"],
    "android.speech": ["RecognitionListener", "RecognizerIntent", "SpeechRecognizer"],
    "android.speech.tts": ["TextToSpeech", "UtteranceProgressListener", "Voice"],
    "android.system": ["ErrnoException", "Os", "OsConstants", "StructStat"],
    "android.telecom": ["Call", "Connection", "ConnectionService", "TelecomManager"],
    "android.telephony": [
        "CarrierConfigManager", "CellInfo", "CellLocation", "PhoneNumberUtils", "PhoneStateListener",
        "ServiceState", "SignalStrength", "SmsManager", "SmsMessage", "SubscriptionInfo",
        "SubscriptionManager", "TelephonyManager",
    ],
    "android.telephony.gsm": ["GsmCellLocation", "SmsManager", "SmsMessage"],
    "android.text": ["Editable", "Html", "Layout", "Spannable", "SpannableString", "TextUtils", "TextWatcher"],
    "android.text.format": ["DateFormat", "DateUtils", "Formatter", "Time"],
    "android.util": [
        "ArrayMap", "ArraySet", "AttributeSet", "Base64", "DisplayMetrics", "JsonReader", "JsonWriter",
        "Log", "LruCache", "Pair", "Patterns", "Property", "Rational", "Size", "SizeF", "SparseArray",
        "SparseBooleanArray", "SparseIntArray", "SparseLongArray", "StateSet", "TimeUtils", "TypedValue", "Xml",
    ],
    "android.view": [
        "ActionMode", "Display", "Gravity", "InputEvent", "KeyEvent", "LayoutInflater", "Menu", "MenuInflater",
        "MenuItem", "MotionEvent", "Surface", "SurfaceHolder", "SurfaceView", "TextureView", "VelocityTracker",
        "View", "ViewGroup", "ViewParent", "ViewTreeObserver", "Window", "WindowManager",
    ],
    "android.view.accessibility": ["AccessibilityEvent", "AccessibilityManager", "AccessibilityNodeInfo"],
    "android.view.animation": ["AlphaAnimation", "Animation", "AnimationUtils", "Interpolator", "TranslateAnimation"],
    "android.view.inputmethod": ["EditorInfo", "InputConnection", "InputMethodManager"],
    "android.webkit": [
        "ConsoleMessage", "CookieManager", "JsResult", "MimeTypeMap", "URLUtil", "ValueCallback",
        "WebChromeClient", "WebResourceRequest", "WebResourceResponse", "WebSettings", "WebStorage",
        "WebView", "WebViewClient",
    ],
    "android.widget": [
        "AdapterView", "ArrayAdapter", "BaseAdapter", "Button", "CheckBox", "EditText", "FrameLayout",
        "GridView", "ImageButton", "ImageView", "LinearLayout", "ListAdapter", "ListView", "ProgressBar",
        "RadioButton", "RelativeLayout", "ScrollView", "SeekBar", "Spinner", "TextView", "Toast",
    ],
    "java.io": [
        "BufferedInputStream", "BufferedOutputStream", "BufferedReader", "BufferedWriter",
        "ByteArrayInputStream", "ByteArrayOutputStream", "DataInputStream", "DataOutputStream",
        "File", "FileDescriptor", "FileInputStream", "FileNotFoundException", "FileOutputStream",
        "FileReader", "FileWriter", "FilterInputStream", "FilterOutputStream", "IOException",
        "InputStream", "InputStreamReader", "ObjectInputStream", "ObjectOutputStream", "OutputStream",
        "OutputStreamWriter", "PrintStream", "PrintWriter", "RandomAccessFile", "Reader",
        "StringReader", "StringWriter", "Writer",
    ],
    "java.lang": [
        "Boolean", "Byte", "Character", "CharSequence", "Class", "ClassCastException", "ClassLoader",
        "ClassNotFoundException", "Cloneable", "Comparable", "Double", "Enum", "Error", "Exception",
        "Float", "IllegalArgumentException", "IllegalStateException", "IndexOutOfBoundsException",
        "Integer", "InterruptedException", "Iterable", "Long", "Math", "NoSuchMethodException",
        "NullPointerException", "Number", "NumberFormatException", "Object", "OutOfMemoryError",
        "Process", "ProcessBuilder", "Runnable", "Runtime", "RuntimeException", "SecurityException",
        "SecurityManager", "Short", "StackTraceElement", "String", "StringBuffer", "StringBuilder",
        "System", "Thread", "ThreadGroup", "ThreadLocal", "Throwable", "UnsupportedOperationException", "Void",
    ],
    "java.lang.ref": ["PhantomReference", "Reference", "ReferenceQueue", "SoftReference", "WeakReference"],
    "java.lang.reflect": ["AccessibleObject", "Array", "Constructor", "Field", "InvocationHandler", "Method", "Modifier", "Proxy"],
    "java.math": ["BigDecimal", "BigInteger", "MathContext", "RoundingMode"],
    "java.net": [
        "ConnectException", "CookieManager", "DatagramPacket", "DatagramSocket", "HttpURLConnection",
        "InetAddress", "InetSocketAddress", "MalformedURLException", "NetworkInterface", "Proxy",
        "ServerSocket", "Socket", "SocketAddress", "SocketException", "SocketTimeoutException",
        "URI", "URL", "URLConnection", "URLDecoder", "URLEncoder", "UnknownHostException",
    ],
    "java.nio": ["Buffer", "ByteBuffer", "ByteOrder", "CharBuffer", "FloatBuffer", "IntBuffer", "MappedByteBuffer"],
    "java.nio.channels": ["Channel", "FileChannel", "SelectionKey", "Selector", "ServerSocketChannel", "SocketChannel"],
    "java.nio.charset": ["Charset", "CharsetDecoder", "CharsetEncoder", "StandardCharsets"],
    "java.security": [
        "DigestInputStream", "DigestOutputStream", "Key", "KeyFactory", "KeyPair", "KeyPairGenerator",
        "KeyStore", "MessageDigest", "NoSuchAlgorithmException", "Permission", "PrivateKey",
        "Provider", "PublicKey", "SecureRandom", "Security", "Signature",
    ],
    "java.security.cert": ["Certificate", "CertificateException", "CertificateFactory", "X509Certificate"],
    "java.security.spec": ["AlgorithmParameterSpec", "KeySpec", "PKCS8EncodedKeySpec", "X509EncodedKeySpec"],
    "java.sql": ["Connection", "Date", "DriverManager", "PreparedStatement", "ResultSet", "SQLException", "Statement", "Timestamp"],
    "java.text": ["DateFormat", "DecimalFormat", "Format", "NumberFormat", "ParseException", "SimpleDateFormat"],
    "java.util": [
        "AbstractList", "AbstractMap", "ArrayDeque", "ArrayList", "Arrays", "BitSet", "Calendar",
        "Collection", "Collections", "Comparator", "Currency", "Date", "Deque", "Dictionary", "EnumMap",
        "EnumSet", "Enumeration", "Formatter", "GregorianCalendar", "HashMap", "HashSet", "Hashtable",
        "IdentityHashMap", "Iterator", "LinkedHashMap", "LinkedHashSet", "LinkedList", "List", "ListIterator",
        "Locale", "Map", "NoSuchElementException", "Objects", "Observable", "Observer", "Optional",
        "PriorityQueue", "Properties", "Queue", "Random", "Scanner", "Set", "SimpleTimeZone", "SortedMap",
        "SortedSet", "Stack", "StringJoiner", "StringTokenizer", "TimeZone", "Timer", "TimerTask",
        "TreeMap", "TreeSet", "UUID", "Vector", "WeakHashMap",
    ],
    "java.util.concurrent": [
        "Callable", "ConcurrentHashMap", "CountDownLatch", "ExecutionException", "Executor",
        "ExecutorService", "Executors", "Future", "FutureTask", "LinkedBlockingQueue",
        "ScheduledExecutorService", "Semaphore", "ThreadFactory", "ThreadPoolExecutor", "TimeUnit",
    ],
    "java.util.concurrent.atomic": ["AtomicBoolean", "AtomicInteger", "AtomicLong", "AtomicReference"],
    "java.util.concurrent.locks": ["Condition", "Lock", "ReadWriteLock", "ReentrantLock", "ReentrantReadWriteLock"],
    "java.util.jar": ["JarEntry", "JarFile", "JarInputStream", "JarOutputStream", "Manifest"],
    "java.util.logging": ["ConsoleHandler", "FileHandler", "Handler", "Level", "LogRecord", "Logger"],
    "java.util.regex": ["Matcher", "Pattern", "PatternSyntaxException"],
    "java.util.zip": ["CRC32", "Deflater", "GZIPInputStream", "GZIPOutputStream", "Inflater", "ZipEntry", "ZipFile", "ZipInputStream", "ZipOutputStream"],
    "javax.crypto": ["Cipher", "CipherInputStream", "CipherOutputStream", "KeyAgreement", "KeyGenerator", "Mac", "SealedObject", "SecretKey", "SecretKeyFactory"],
    "javax.crypto.spec": ["DESKeySpec", "GCMParameterSpec", "IvParameterSpec", "PBEKeySpec", "SecretKeySpec"],
    "javax.net": ["ServerSocketFactory", "SocketFactory"],
    "javax.net.ssl": ["HostnameVerifier", "HttpsURLConnection", "KeyManagerFactory", "SSLContext", "SSLSocket", "SSLSocketFactory", "TrustManager", "TrustManagerFactory", "X509TrustManager"],
    "javax.security.auth.x500": ["X500Principal"],
    "javax.xml.parsers": ["DocumentBuilder", "DocumentBuilderFactory", "SAXParser", "SAXParserFactory"],
    "javax.xml.transform": ["Transformer", "TransformerFactory"],
    "junit.framework": ["Assert", "AssertionFailedError", "Test", "TestCase", "TestFailure", "TestListener", "TestResult", "TestSuite"],
    "junit.runner": ["BaseTestRunner", "Version"],
    "org.json": ["JSONArray", "JSONException", "JSONObject", "JSONStringer", "JSONTokener"],
    "org.w3c.dom": [
        "Attr", "CDATASection", "CharacterData", "Comment", "DOMException", "DOMImplementation",
        "Document", "DocumentFragment", "DocumentType", "Element", "EntityReference", "NamedNodeMap",
        "Node", "NodeList", "ProcessingInstruction", "Text",
    ],
    "org.xml.sax": [
        "Attributes", "ContentHandler", "DTDHandler", "EntityResolver", "ErrorHandler", "InputSource",
        "Locator", "SAXException", "SAXNotRecognizedException", "SAXNotSupportedException",
        "SAXParseException", "XMLReader",
    ],
    "org.xml.sax.helpers": ["AttributesImpl", "DefaultHandler", "XMLReaderFactory"],
    "org.apache.http": ["Header", "HttpEntity", "HttpHost", "HttpRequest", "HttpResponse", "HttpStatus", "StatusLine"],
    "org.apache.http.params": ["BasicHttpParams", "HttpConnectionParams", "HttpParams"],
    # Google API side
    "com.google.android.gms.ads": ["AdListener", "AdRequest", "AdSize", "AdView", "InterstitialAd", "MobileAds"],
    "com.google.android.gms.ads.identifier": ["AdvertisingIdClient"],
    "com.google.android.gms.analytics": ["GoogleAnalytics", "HitBuilders", "Tracker"],
    "com.google.android.gms.auth": ["GoogleAuthException", "GoogleAuthUtil"],
    "com.google.android.gms.auth.api.signin": ["GoogleSignInAccount", "GoogleSignInOptions"],
    "com.google.android.gms.common": ["ConnectionResult", "GoogleApiAvailability", "GooglePlayServicesUtil"],
    "com.google.android.gms.common.api": ["GoogleApiClient", "PendingResult", "Result", "Status"],
    "com.google.android.gms.gcm": ["GcmListenerService", "GcmNetworkManager", "GoogleCloudMessaging"],
    "com.google.android.gms.iid": ["InstanceID", "InstanceIDListenerService"],
    "com.google.android.gms.location": ["FusedLocationProviderApi", "Geofence", "LocationRequest", "LocationServices", "LocationSettingsRequest"],
    "com.google.android.gms.maps": ["CameraUpdate", "CameraUpdateFactory", "GoogleMap", "MapFragment", "MapView", "SupportMapFragment"],
    "com.google.android.gms.maps.model": ["BitmapDescriptor", "CameraPosition", "LatLng", "Marker", "MarkerOptions", "Polyline"],
    "com.google.android.gms.safetynet": ["SafetyNet", "SafetyNetApi"],
    "com.google.android.gms.tasks": ["OnCompleteListener", "OnFailureListener", "OnSuccessListener", "Task", "Tasks"],
    "com.google.android.gms.wearable": ["DataApi", "MessageApi", "Node", "NodeApi", "Wearable"],
    "com.google.firebase": ["FirebaseApp", "FirebaseOptions"],
    "com.google.firebase.analytics": ["FirebaseAnalytics"],
    "com.google.firebase.auth": ["AuthResult", "FirebaseAuth", "FirebaseUser"],
    "com.google.firebase.crash": ["FirebaseCrash"],
    "com.google.firebase.database": ["DataSnapshot", "DatabaseError", "DatabaseReference", "FirebaseDatabase", "ValueEventListener"],
    "com.google.firebase.iid": ["FirebaseInstanceId", "FirebaseInstanceIdService"],
    "com.google.firebase.messaging": ["FirebaseMessaging", "FirebaseMessagingService", "RemoteMessage"],
    "com.google.firebase.remoteconfig": ["FirebaseRemoteConfig"],
    "com.google.firebase.storage": ["FirebaseStorage", "StorageReference", "UploadTask"],
}


def pad_packages(real: list[str], target: int, fill_root: str) -> list[str]:
    pkgs = list(real)
    i = 1
    while len(pkgs) < target:
        pkgs.append(f"{fill_root}.p{i:03d}")
        i += 1
    if len(pkgs) > target:
        raise SystemExit(f"too many real packages under {fill_root}: {len(pkgs)} > {target}")
    return pkgs


def pad_classes(packages: list[str], curated: dict[str, list[str]], target: int) -> list[str]:
    classes = []
    for pkg in packages:
        for name in curated.get(pkg, []):
            classes.append(f"{pkg}.{name}")
    if len(classes) > target:
        raise SystemExit(f"too many curated classes: {len(classes)} > {target}")
    # Round-robin filler so every package keeps a plausible class population.
    i = 0
    while len(classes) < target:
        pkg = packages[i % len(packages)]
        classes.append(f"{pkg}.Gen{i:04d}")
        i += 1
    return classes


def main() -> None:
    platform_pkgs = pad_packages(PLATFORM_PACKAGES, N_PLATFORM_PACKAGES, "android.aux")
    google_pkgs = pad_packages(GOOGLE_PACKAGES, N_GOOGLE_PACKAGES, "com.google.aux")

    curated_platform = {p: c for p, c in CURATED_CLASSES.items() if not p.startswith("com.google")}
    curated_google = {p: c for p, c in CURATED_CLASSES.items() if p.startswith("com.google")}
    platform_classes = pad_classes(platform_pkgs, curated_platform, N_PLATFORM_CLASSES)
    google_classes = pad_classes(google_pkgs, curated_google, N_GOOGLE_CLASSES)

    all_pkgs = platform_pkgs + google_pkgs
    all_classes = platform_classes + google_classes
    assert len(all_pkgs) == len(set(all_pkgs)) == N_PLATFORM_PACKAGES + N_GOOGLE_PACKAGES
    assert len(all_classes) == len(set(all_classes)) == N_PLATFORM_CLASSES + N_GOOGLE_CLASSES

    OUT_DIR.mkdir(parents=True, exist_ok=True)
    pkg_file = OUT_DIR / "packages.txt"
    cls_file = OUT_DIR / "classes.txt"
    with pkg_file.open("w", encoding="utf-8", newline="\n") as f:
        f.write("# API package whitelist: 243 platform + 95 google names.\n")
        f.write("# *.aux.* entries are deterministic filler standing in for the\n")
        f.write("# remainder of the documented API-level-24 package inventory.\n")
        for p in sorted(all_pkgs):
            f.write(p + "\n")
    with cls_file.open("w", encoding="utf-8", newline="\n") as f:
        f.write("# API class whitelist: 4855 platform + 1116 google names.\n")
        f.write("# *.Gen#### entries are deterministic filler (see packages.txt).\n")
        for c in sorted(all_classes):
            f.write(c + "\n")
    print(f"wrote {pkg_file} ({len(all_pkgs)} packages)")
    print(f"wrote {cls_file} ({len(all_classes)} classes)")


if __name__ == "__main__":
    main()
